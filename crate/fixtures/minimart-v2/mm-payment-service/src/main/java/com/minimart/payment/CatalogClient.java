package com.minimart.payment;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class CatalogClient {

    private final RestTemplate restTemplate = new RestTemplate();

    public String priceList() {
        return restTemplate.getForObject(
                "http://mm-catalog-service/api/v1/catalog/items", String.class);
    }
}

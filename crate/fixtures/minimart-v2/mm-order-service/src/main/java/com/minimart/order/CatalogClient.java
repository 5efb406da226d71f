package com.minimart.order;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class CatalogClient {

    private final RestTemplate restTemplate = new RestTemplate();

    public ItemDto itemById(String itemId) {
        return restTemplate.getForObject(
                "http://mm-catalog-service/api/v1/catalog/items/" + itemId, ItemDto.class);
    }
}

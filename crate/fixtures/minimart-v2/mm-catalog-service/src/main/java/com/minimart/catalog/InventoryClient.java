package com.minimart.catalog;

import org.springframework.http.HttpEntity;
import org.springframework.http.HttpMethod;
import org.springframework.http.ResponseEntity;
import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class InventoryClient {

    private final RestTemplate restTemplate = new RestTemplate();

    // The warehouse endpoint is tenant specific and arrives via configuration.
    public String stockLevel(String url) {
        ResponseEntity<String> response =
                restTemplate.exchange(url, HttpMethod.GET, HttpEntity.EMPTY, String.class);
        return response.getBody();
    }
}

package com.minimart.user;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class OrderClient {

    private final RestTemplate restTemplate = new RestTemplate();

    public String placeOrder(Object payload) {
        return restTemplate.postForObject(
                "http://mm-order-service/api/v1/orders", payload, String.class);
    }

    // Gateway strips the host, so status probes go through the relative route.
    public String componentStatus(String component) {
        return restTemplate.getForObject("/api/v1/status/" + component, String.class);
    }
}
